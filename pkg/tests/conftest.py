"""Shared fixtures: schema catalogs and small in-memory databases."""

from __future__ import annotations

import random
import sqlite3

import pytest

from eagersql.sqlcore import SchemaCatalog

SALES_CATALOG = SchemaCatalog(
    tables={
        "sales": ["item", "price", "quantity", "store_id", "year"],
        "store": ["store_id", "state", "name"],
    },
    types={
        ("sales", "item"): "str",
        ("sales", "price"): "num",
        ("sales", "quantity"): "int",
        ("sales", "store_id"): "int",
        ("sales", "year"): "int",
        ("store", "store_id"): "int",
        ("store", "state"): "str",
        ("store", "name"): "str",
    },
)

TPCDS_Q1 = """
WITH customer_total_return AS (
  SELECT sr_customer_sk AS ctr_customer_sk, sr_store_sk AS ctr_store_sk,
         sum(sr_return_amt) AS ctr_total_return
  FROM store_returns, date_dim
  WHERE sr_returned_date_sk = d_date_sk AND d_year = 2000
  GROUP BY sr_customer_sk, sr_store_sk)
SELECT c_customer_id
FROM customer_total_return ctr1, store, customer
WHERE ctr1.ctr_total_return > (
    SELECT avg(ctr_total_return) * 1.2 FROM customer_total_return ctr2
    WHERE ctr1.ctr_store_sk = ctr2.ctr_store_sk)
  AND s_store_sk = ctr1.ctr_store_sk
  AND s_state = 'TN'
  AND ctr1.ctr_customer_sk = c_customer_sk
ORDER BY c_customer_id
LIMIT 100
"""

TPCDS_Q1_CATALOG = SchemaCatalog(
    tables={
        "store_returns": ["sr_customer_sk", "sr_store_sk", "sr_return_amt", "sr_returned_date_sk"],
        "date_dim": ["d_date_sk", "d_year"],
        "store": ["s_store_sk", "s_state"],
        "customer": ["c_customer_sk", "c_customer_id"],
    }
)


@pytest.fixture
def sales_catalog() -> SchemaCatalog:
    return SALES_CATALOG


@pytest.fixture
def tpcds_q1_catalog() -> SchemaCatalog:
    return TPCDS_Q1_CATALOG


def populate_sales(conn: sqlite3.Connection, rows: int = 1000, seed: int = 7) -> None:
    rng = random.Random(seed)
    conn.execute("CREATE TABLE sales (item TEXT, price REAL, quantity INTEGER, store_id INTEGER, year INTEGER)")
    conn.execute("CREATE TABLE store (store_id INTEGER, state TEXT, name TEXT)")
    states = ["TX", "CA", "NY", "WA"]
    for sid in range(1, 9):
        conn.execute("INSERT INTO store VALUES (?, ?, ?)", (sid, states[sid % 4], f"store_{sid}"))
    items = ["apple", "pear", "plum", "kiwi", "fig", "date"]
    for _ in range(rows):
        conn.execute(
            "INSERT INTO sales VALUES (?, ?, ?, ?, ?)",
            (
                rng.choice(items),
                round(rng.uniform(0.5, 20.0), 2),
                rng.randint(1, 100),
                rng.randint(1, 8),
                rng.choice([2000, 2001, 2002, 2003]),
            ),
        )
    conn.commit()


@pytest.fixture
def sales_db() -> sqlite3.Connection:
    conn = sqlite3.connect(":memory:")
    populate_sales(conn)
    yield conn
    conn.close()
