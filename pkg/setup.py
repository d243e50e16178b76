#
# This script builds and installs soqdot.
#
# To install, type:
#
#  pip install .
#
# soqdot is pure Python; it needs numpy and scipy at run time and pytest
# to run the test suite:
#
#  pytest                 # fast checks
#  pytest -m slow         # full-size sweeps and Monte Carlo runs
#
import os, sys

# Test to make sure we actually have NumPy.
try:
  import numpy
except ImportError:
  print("Error: Cannot import NumPy. Can't continue.")
  sys.exit(1)

from setuptools import setup

# Create file containing soqdot and numpy version.
def create_version_file():
  if os.path.exists(soqdot_vfile):
    os.remove(soqdot_vfile)

  vfile = open(soqdot_vfile,'w')
  vfile.write("version = '%s'\n" % soqdot_version)
  vfile.write("array_module = 'numpy'\n")
  vfile.write("array_module_version = '%s'\n" % array_module_version)
  vfile.write("python_version = '%s'\n" % ".".join(map(str,
                                                  sys.version_info[:3])))
  vfile.close()

#----------------------------------------------------------------------
# Main section
#----------------------------------------------------------------------

long_description = open('README.md','r').read()

SOQDOT_PKG_NAME = 'soqdot'                # Name of package to install.

# Construct the version file.
from numpy import __version__ as array_module_version

soqdot_vfile   = "src/soqdot/version.py"   # Name of version file.
soqdot_version = open('version','r').readlines()[0].strip('\n')
create_version_file()

setup (name = SOQDOT_PKG_NAME,
       version          = soqdot_version,
       license          = 'BSD-3-Clause',
       platforms        = "Unix, Linux, Windows, MacOSX",
       description      = 'Entropies, correlations and VMC pair densities '
                          'of a spin-orbit coupled double quantum dot',
       long_description = long_description,
       long_description_content_type = 'text/markdown',
       python_requires  = '>=3.8',
       package_dir      = { '' : 'src'},
       packages         = [ SOQDOT_PKG_NAME ],
       py_modules       = [ 'Soqdot' ],
       install_requires = [ 'numpy>=1.20', 'scipy>=1.7' ],
       extras_require   = { 'test' : [ 'pytest>=7' ] },
       entry_points     = { 'console_scripts' :
                            [ 'soqdot = soqdot.cli:main' ] },
)
