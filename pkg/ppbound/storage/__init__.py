"""Storage implementations for scan rows."""

from ppbound.storage.base import (
    DryRunStorage,
    ResultStorage,
    ScanRow,
    StorageType,
    create_storage,
)
from ppbound.storage.csv import CSVStorage
from ppbound.storage.sqlite import SQLiteStorage

__all__ = [
    "CSVStorage",
    "DryRunStorage",
    "ResultStorage",
    "SQLiteStorage",
    "ScanRow",
    "StorageType",
    "create_storage",
]
