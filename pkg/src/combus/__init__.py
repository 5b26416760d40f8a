"""combus: compose multimodal interactive agents over a typed event-bus.

Interactions are recorded both as multimodal scenario data on disk and as
an episodic knowledge graph of attributed, perspectivized claims.
"""

__version__ = "0.1.0"
