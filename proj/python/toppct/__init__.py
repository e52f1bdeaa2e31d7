"""Tie-corrected top-x% citation indicators and sampling experiments.

Thin re-export of the compiled extension; see the project README for the
file formats and the CLI.
"""

from ._toppct import *  # noqa: F401,F403
from ._toppct import __version__  # noqa: F401
