#!/usr/bin/env python3
"""
QGRAND: quantum random linear codes decoded by noise guessing.

Main entry point; see ``python main.py --help`` for the subcommands.
"""

import sys

from src.cli import main


if __name__ == "__main__":
    sys.exit(main())
