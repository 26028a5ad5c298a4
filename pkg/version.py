# Copyright Polymorph Corporation (2026)

__version__ = "0.1.0"
