"""Python bindings for the polyarena engine."""

from ._core import (
    ActionOutOfSpec,
    Environment,
    Error,
    SchemaError,
    SteppedAfterLast,
    UnknownBuiltin,
    benchmark,
    builtin_names,
    generate_dataset,
    recipe_text,
    verify_replay,
)

__all__ = [
    "ActionOutOfSpec",
    "Environment",
    "Error",
    "SchemaError",
    "SteppedAfterLast",
    "UnknownBuiltin",
    "benchmark",
    "builtin_names",
    "generate_dataset",
    "recipe_text",
    "verify_replay",
]
