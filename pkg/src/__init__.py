# QGRAND / QRLC: quantum random linear codes decoded by noise guessing
__version__ = "1.0.0"
