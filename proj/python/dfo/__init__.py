"""Python bindings for the dfo simulator."""

from ._dfo import (
    DfoError,
    format_csv,
    gram_matrix,
    generate,
    loss,
    mixing_bound,
    network_check,
    oracle,
    preset_names,
    preset_text,
    run,
    validate,
)

CSV_COLUMNS = ("T", "max_err", "min_err", "mean_consensus", "max_gradnorm", "empirical_G")


def read_csv(path):
    """Read a metrics CSV; returns (metadata lines, list of row dicts)."""
    metadata, rows, header = [], [], None
    with open(path) as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                metadata.append(line[1:].strip())
            elif header is None:
                header = line.split(",")
            elif line:
                values = line.split(",")
                rows.append({k: (int(v) if k == "T" else float(v)) for k, v in zip(header, values)})
    if header is None or tuple(header) != CSV_COLUMNS:
        raise ValueError(f"{path}: unexpected header {header}")
    return metadata, rows
