#!/usr/bin/env python3
"""End-to-end demonstration on the unit square: isolate the first
nonzero Neumann mode, simulate to the patterned steady state, and match
the pattern against the computed eigenspace."""

import sys

from modeiso.cli import main as cli_main

CONFIG = "configs/square_mode1.yaml"

if __name__ == "__main__":
    sys.exit(cli_main(["pipeline", "--config", CONFIG]))
