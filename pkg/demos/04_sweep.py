"""
Sweeping the Kerr loss from the command line
============================================

The ``kerrblowup`` command runs the same machinery from a TOML file.  This
script drives it in-process and prints the CSV table.
"""

import sys
from pathlib import Path

from kerrblowup.cli import main

config = Path(__file__).with_name("configs") / "sweep_im_s.toml"

# Eleven values of Im s between 0 and 1, spread over two worker processes.
# Rows come back in input order whatever the worker count.
sys.exit(main(["sweep", "--config", str(config), "--quiet"]))
