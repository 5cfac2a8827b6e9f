"""Command-line entry point for the Herbrand workbench."""

import sys

from core.cli_harness import main

if __name__ == "__main__":
    sys.exit(main())
