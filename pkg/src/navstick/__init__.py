"""NavStick: thumbstick line-of-sight surveying for blind-accessible games.

Engine, deterministic simulator, replay tooling, and session protocol.
"""

__version__ = "0.1.0"
