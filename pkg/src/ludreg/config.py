import os

LUDREG_VERSION = '0.3.0'

# Set LUDREG_DEBUG=1 to re-certify every conv SO(d) projection
DEBUG = os.environ.get('LUDREG_DEBUG', '0').lower() not in (
    '', '0', 'false', 'off')

ROTATION_TOL = 1e-9
SKEW_TOL = 1e-12
ANGLE_PI_TOL = 1e-6
DEGENERACY_TOL = 1e-9
