"""Unbiased sequential estimation for boundary-stopped multinomial walks."""

from stopwalk._core import *  # noqa: F401,F403
from stopwalk._core import __doc__ as _core_doc  # noqa: F401
