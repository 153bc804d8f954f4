"""Seeded synthetic star schema: one fact table plus three dimensions.

All values come from a numpy generator with a fixed seed, so repeated runs
produce byte-identical databases.
"""

from __future__ import annotations

import sqlite3

import numpy as np

DEFAULT_SEED = 7
DEFAULT_FACT_ROWS = 100_000

STATES = ["CA", "NY", "TX", "WA", "IL", "GA"]
CATEGORIES = [
    "grocery", "electronics", "apparel", "garden",
    "sports", "toys", "books", "music",
]

SCHEMA = """
CREATE TABLE date_dim (
    d_date_sk INTEGER PRIMARY KEY,
    d_year INTEGER,
    d_moy INTEGER,
    d_dom INTEGER
);
CREATE TABLE store (
    s_store_sk INTEGER PRIMARY KEY,
    s_state TEXT,
    s_name TEXT
);
CREATE TABLE item (
    i_item_sk INTEGER PRIMARY KEY,
    i_category TEXT,
    i_brand TEXT,
    i_current_price REAL
);
CREATE TABLE store_sales (
    ss_sold_date_sk INTEGER,
    ss_item_sk INTEGER,
    ss_store_sk INTEGER,
    ss_quantity INTEGER,
    ss_sales_price REAL,
    ss_net_profit REAL
);
"""

N_DATES = 3 * 12 * 28  # years 2000-2002, 28 days per month
N_STORES = 12
N_ITEMS = 200


def populate(
    conn: sqlite3.Connection,
    seed: int = DEFAULT_SEED,
    fact_rows: int = DEFAULT_FACT_ROWS,
) -> None:
    """Create and fill the star schema; no-op if store_sales already exists."""
    existing = conn.execute(
        "SELECT count(*) FROM sqlite_master WHERE type='table' AND name='store_sales'"
    ).fetchone()[0]
    if existing:
        return
    rng = np.random.default_rng(seed)
    conn.executescript(SCHEMA)

    dates = [
        (sk + 1, 2000 + sk // 336, 1 + (sk % 336) // 28, 1 + sk % 28)
        for sk in range(N_DATES)
    ]
    conn.executemany("INSERT INTO date_dim VALUES (?, ?, ?, ?)", dates)

    stores = [
        (sk + 1, STATES[sk % len(STATES)], f"store_{sk + 1}")
        for sk in range(N_STORES)
    ]
    conn.executemany("INSERT INTO store VALUES (?, ?, ?)", stores)

    prices = np.round(rng.uniform(1, 100, N_ITEMS), 2)
    items = [
        (sk + 1, CATEGORIES[sk % len(CATEGORIES)], f"brand_{sk % 40 + 1}", float(prices[sk]))
        for sk in range(N_ITEMS)
    ]
    conn.executemany("INSERT INTO item VALUES (?, ?, ?, ?)", items)

    facts = zip(
        rng.integers(1, N_DATES + 1, fact_rows).tolist(),
        rng.integers(1, N_ITEMS + 1, fact_rows).tolist(),
        rng.integers(1, N_STORES + 1, fact_rows).tolist(),
        rng.integers(1, 11, fact_rows).tolist(),
        np.round(rng.uniform(1, 100, fact_rows), 2).tolist(),
        np.round(rng.normal(5, 10, fact_rows), 2).tolist(),
    )
    conn.executemany(
        "INSERT INTO store_sales VALUES (?, ?, ?, ?, ?, ?)", list(facts)
    )
    conn.commit()
