"""Default physical constants for the simulated platform.

Both values are overridable everywhere they appear and are stamped into run
sidecars as defaults, not as measurements: the drive amplitude sits in the
(2*pi) 17-21 MHz range the platform operates at, and the carrier is the
zero-field splitting minus the Zeeman shift at the operating field.
"""
import numpy as np

A_DEFAULT = 2 * np.pi * 20.0e6          # rad/s
OMEGA0_DEFAULT = 2 * np.pi * 1.4455e9   # rad/s
