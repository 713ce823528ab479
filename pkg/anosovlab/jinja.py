"""Jinja2 Utility Functions"""

from pathlib import Path
from typing import Tuple
from jinja2.environment import Environment
from jinja2.loaders import FileSystemLoader
from jinja2 import StrictUndefined, TemplateError
from anosovlab import settings, utils
from anosovlab.errors import RenderError


def create_filesys_env(searchpath: Path = settings.TEMPLATE_DIR) -> Tuple[Environment, FileSystemLoader]:
    """Sets up a Jinja2 Environment for the report templates.

    Initializes a Jinja2 Environment with a FileSystemLoader on the given
    search path, adds loop controls and registers every ``filter_*`` and
    ``global_*`` function of the ``handlers.py`` module found there (without
    the prefix). Undefined variables raise instead of rendering as empty
    strings, and block tags do not leave blank lines behind.

    Args:
        searchpath (Path): The directory path used to locate templates.

    Returns:
        A tuple containing the configured Jinja2 Environment and FileSystemLoader.

    Example:
        >>> env, loader = create_filesys_env()
        >>> print(env.get_template("orbits.tsv.j2").render(report=report))
    """

    loader = FileSystemLoader(searchpath)
    env = Environment(
        loader=loader,
        undefined=StrictUndefined,
        trim_blocks=True,
        lstrip_blocks=True,
        keep_trailing_newline=True,
    )
    env.add_extension("jinja2.ext.loopcontrols")

    handlers = Path(searchpath) / "handlers.py"
    if handlers.is_file():
        for name, func in utils.load_jinja_filters(handlers):
            env.filters[name[len("filter_") :]] = func
        for name, func in utils.load_jinja_globals(handlers):
            env.globals[name[len("global_") :]] = func
    return env, loader


def render(template_name: str, searchpath: Path = settings.TEMPLATE_DIR, **context) -> str:
    """Render a template with the given context.

    Raises:
        RenderError: The template does not compile or refers to missing data.
    """
    env, _ = create_filesys_env(searchpath)
    try:
        return env.get_template(template_name).render(**context)
    except TemplateError as exc:
        raise RenderError(f"cannot render {template_name}: {exc}") from exc
