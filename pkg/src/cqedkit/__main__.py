"""Entry point for ``python -m cqedkit``."""

import sys

from .cli import main

sys.exit(main())
