"""Broadcasting on trees: exact measures, discrepancy bounds and certificates."""

from ._treecast import *  # noqa: F401,F403
from ._treecast import TreecastError, __doc__  # noqa: F401
