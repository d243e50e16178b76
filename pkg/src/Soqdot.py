from soqdot import __all__ as _soqdot_all
from soqdot import *

__all__ = []
__all__.extend(_soqdot_all)
