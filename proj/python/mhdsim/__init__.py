try:
    from ._mhdsim import *  # noqa: F401,F403
    from ._mhdsim import __version__  # noqa: F401
except ImportError:  # build-tree layout: extension next to the package
    from _mhdsim import *  # noqa: F401,F403
    from _mhdsim import __version__  # noqa: F401
