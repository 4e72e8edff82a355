"""Exact discrete α-ham-sandwich cuts by rotation and line following."""

from .instance import Instance, PointRef, parse_instance, serialize_instance

__all__ = ["Instance", "PointRef", "parse_instance", "serialize_instance"]
__version__ = "0.1.0"
