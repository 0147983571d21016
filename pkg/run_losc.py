#!/usr/bin/env python3
"""
Launcher for the losc command line without installing the package.
Puts src/ on the import path and hands the arguments to the click group.
"""

import os
import sys


def main():
    # Get the directory where this script is located
    script_dir = os.path.dirname(os.path.abspath(__file__))
    src_dir = os.path.join(script_dir, "src")

    if not os.path.exists(os.path.join(src_dir, "main.py")):
        print(f"Error: Could not find main.py in {src_dir}", file=sys.stderr)
        sys.exit(2)

    sys.path.insert(0, src_dir)
    from main import main as losc_main

    losc_main(sys.argv[1:])


if __name__ == "__main__":
    main()
