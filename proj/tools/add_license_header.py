#!/usr/bin/env python3
"""Prepends the Apache-2.0 header to every C++ source in the repository."""

import pathlib
import sys

HEADER = """\
// Copyright 2026 The nftl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

"""

ROOTS = ("include", "src", "tools", "tests")


def main() -> int:
    repo = pathlib.Path(__file__).resolve().parent.parent
    changed = 0
    for root in ROOTS:
        for path in sorted((repo / root).rglob("*")):
            if path.suffix not in (".hpp", ".cpp") or not path.is_file():
                continue
            text = path.read_text(encoding="utf-8")
            if text.startswith(HEADER.splitlines()[0]):
                continue
            path.write_text(HEADER + text, encoding="utf-8")
            changed += 1
    print(f"headers added to {changed} files")
    return 0


if __name__ == "__main__":
    sys.exit(main())
