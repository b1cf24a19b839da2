"""Desk-scale open scholarly knowledge graph engine.

Ingests bibliographic records, resolves them into five linked entity
types (works, authors, venues, institutions, concepts) keyed by canonical
external identifiers, and distributes the graph as a partitioned data
dump, a REST API, and a browsable explorer.
"""

__all__ = ["__version__"]

__version__ = "0.1.0"
