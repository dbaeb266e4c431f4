"""Multi-tenant agricultural data hub.

Catalog of data/tool/model/collection entities addressed by logical
paths, with separated metadata, deterministic semantic search, automatic
operation provenance, sandboxed tool execution, a REST API, and a CLI.
"""

__version__ = "0.1.0"

from .hub import Hub

__all__ = ["Hub", "__version__"]
