"""Reciprocity calibration of dual-antenna repeaters.

Simulation of bi-directional calibration measurements, nonlinear
least-squares estimation of the repeater forward/reverse gain ratio, the
multi-repeater Hadamard protocol, and a Monte-Carlo RMSE-vs-SNR harness.
"""

try:  # installed-package layout: extension lives inside the package
    from repcal._repcal import *  # noqa: F401,F403
except ImportError:  # build-tree layout: extension on sys.path
    from _repcal import *  # noqa: F401,F403
