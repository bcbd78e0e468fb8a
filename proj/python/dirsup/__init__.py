from ._dirsup import *  # noqa: F401,F403
from ._dirsup import __doc__  # noqa: F401
