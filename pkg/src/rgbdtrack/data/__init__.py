from .metrics import (
    show_report_table,
    write_report_csv
)


def get_report_writers_map() -> dict:
    """Mapping between report formats and report writers.

    Returns:
        dict: Each writer takes the per-sequence report and an optional
            output file.
    """
    return {
        "csv": write_report_csv,
        "table": lambda report, file=None: show_report_table(report)
    }
