"""Berry phase of a planar spin transported around a current-carrying wire."""

from ._planarspin import *  # noqa: F401,F403
from ._planarspin import __version__, Error  # noqa: F401
