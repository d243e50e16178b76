"""
soqdot models two electrons in a spin-orbit coupled double quantum dot:
closed-form and numerical entropies, correlations and measurement
diagnostics of the two-electron state, configuration-interaction sweeps
over the spin-orbit strength and electric field, and continuous-spin
variational Monte Carlo for chains of dots.
"""

__all__ = ['ConfigError', 'DomainError', 'NotHermitianError', 'NumericError',
           'ShapeError', 'SoqdotError', 'StateError', '__version__']

from .errors import (ConfigError, DomainError, NotHermitianError,
                     NumericError, ShapeError, SoqdotError, StateError)

#
#  Version number of the package and of the numpy it was built with.
#
from . import version as soqdot_version
__version__              = soqdot_version.version
__array_module__         = soqdot_version.array_module
__array_module_version__ = soqdot_version.array_module_version

from . import linalg, states, analytic, dqd, vmc, units, config, cli
from .linalg import *
from .states import *
from .analytic import *
from .dqd import *
from .vmc import *
from .units import *
from .config import *
from .cli import run, main

for _m in (linalg, states, analytic, dqd, vmc, units, config):
  __all__.extend(_m.__all__)
__all__.extend(['run', 'main'])
del _m
