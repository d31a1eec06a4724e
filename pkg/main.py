"""
rollscan command-line entry point.
Equivalent to the ``rollscan`` console script.
"""

import sys

from rollscan.cli import main

if __name__ == "__main__":
    sys.exit(main())
