#
# Exception hierarchy for soqdot.
#
# Messages follow the "function: Error: what" form used throughout the
# package so a failure can be traced back to the routine that raised it.
#

class SoqdotError(Exception):
  pass

class ShapeError(SoqdotError, ValueError):
  pass

class NotHermitianError(SoqdotError, ValueError):
  def __init__(self, message, asymmetry=None):
    SoqdotError.__init__(self, message)
    self.asymmetry = asymmetry

class DomainError(SoqdotError, ValueError):
  pass

class StateError(SoqdotError, ValueError):
  pass

class NumericError(SoqdotError, RuntimeError):
  pass

class ConfigError(SoqdotError, ValueError):
  """
Invalid run configuration.

diagnostics -- list of (field, message) pairs, one per offending key.
  """
  def __init__(self, diagnostics):
    self.diagnostics = list(diagnostics)
    text = "; ".join("%s: %s" % (f, m) for f, m in self.diagnostics)
    SoqdotError.__init__(self, "parse_config: Error: " + text)
