#!/usr/bin/env python3
"""
abstab tool: spectral stabilizerness tests from the command line.

  python3 abstab_tool.py test -d 3 -n 1 --spectrum 0.5,0.5,0
  python3 abstab_tool.py enumerate stab -d 2 -n 2
  python3 abstab_tool.py conjectures -n 2 --exhaustive

Environment variables (all overridable via CLI flags):
  ABSTAB_OUTPUT_DIR   output directory          (default: ./abstab-out)
  ABSTAB_JOBS         sampling worker threads   (default: 1)
  ABSTAB_LOG_LEVEL    log level                 (default: INFO)
  ABSTAB_GUARD_DIM    dense operator d^n guard  (default: 64)
  ABSTAB_VERBOSE      debug logging             (default: false)
"""
import sys
import os

# Add parent directory to path for the abstab package
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from abstab.cli import main

if __name__ == '__main__':
    sys.exit(main())
