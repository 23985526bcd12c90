import sys
from collections.abc import Iterable, Mapping

import pandas as pd
from loguru import logger
from pandera import Check, Column, DataFrameSchema

RESULT_COLUMNS = ["n", "N", "t", "x", "value", "abs_error"]

RESULT_SCHEMA = DataFrameSchema(
    {
        "n": Column(int, Check.greater_than_or_equal_to(0)),
        "N": Column(int, Check.greater_than_or_equal_to(0)),
        "t": Column(float, Check.greater_than_or_equal_to(0)),
        "x": Column(float),
        "value": Column(float),
        "abs_error": Column(float, Check.greater_than_or_equal_to(0), nullable=True),
    },
    strict=True,
    coerce=True,
    ordered=True,
)


def results_frame(rows: Iterable[Mapping[str, float]]) -> pd.DataFrame:
    """Collect result rows in input order and validate them against RESULT_SCHEMA."""
    df = pd.DataFrame.from_records(list(rows), columns=RESULT_COLUMNS)
    return validate_results(df)


def validate_results(df: pd.DataFrame) -> pd.DataFrame:  # noqa: D103
    validated = RESULT_SCHEMA.validate(df)
    logger.info("Successfully validated RESULT_SCHEMA.")
    return validated


def emit_csv(rows: Iterable[Mapping[str, float]] | pd.DataFrame, path: str | None) -> None:
    """Write result rows as ``n,N,t,x,value,abs_error`` with 17 significant digits.

    Args:
        rows: Result rows, or a frame that already has the result columns.
        path (str | None): Destination file, standard output when None.

    Raises:
        OSError: If the file cannot be written; the message names the path.
    """
    df = validate_results(rows) if isinstance(rows, pd.DataFrame) else results_frame(rows)
    if path is None:
        df.to_csv(sys.stdout, index=False, float_format="%.17g", lineterminator="\n")
        return
    try:
        df.to_csv(path, index=False, float_format="%.17g", lineterminator="\n")
    except OSError as e:
        logger.error(f"Cannot write results to {path}.")
        raise OSError(f"cannot write results to {path}: {e}") from e
    logger.info(f"Successfully wrote {len(df)} rows to {path}.")
