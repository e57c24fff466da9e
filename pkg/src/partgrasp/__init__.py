"""Language-driven part-level grasping pipeline against a synthetic RGB-D simulator."""

__version__ = "0.1.0"
