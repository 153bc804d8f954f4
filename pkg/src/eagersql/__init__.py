"""Speculative ad-hoc SQL querying middleware.

Precomputes temporary tables and previews while a query is still being
typed, and answers the final query by rewriting it over those tables.
"""

__version__ = "0.1.0"
