"""Filters and globals for the report templates.

Functions named ``filter_<name>`` become the jinja2 filter ``<name>``,
functions named ``global_<name>`` become the global ``<name>``.
"""


def filter_tsv_cell(value) -> str:
    """Render a value as one TSV cell; tabs and newlines become spaces."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (list, tuple)):
        value = " ".join(str(v) for v in value)
    return str(value).replace("\t", " ").replace("\r", " ").replace("\n", " ")


def filter_dot_quote(value) -> str:
    """Quote a string as a DOT identifier."""
    text = str(value).replace("\\", "\\\\").replace('"', '\\"')
    return f'"{text}"'


def filter_matrix(rows) -> str:
    return ";".join(",".join(str(x) for x in row) for row in rows)


def global_tsv_row(*values) -> str:
    return "\t".join(filter_tsv_cell(v) for v in values)
