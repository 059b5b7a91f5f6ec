from isolab._core import *  # noqa: F401,F403
from isolab._core import __doc__  # noqa: F401
