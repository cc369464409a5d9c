try:
    import tomllib
except ImportError:  # Python 3.10
    import tomli as tomllib

from importlib import resources

from .errors import FormatError


def load_toml(path=None, default=None) -> dict:
    """Parse a TOML file, or the packaged data file `default`."""
    try:
        if path is None:
            text = resources.files("fanobound").joinpath("data", default).read_text("utf-8")
        else:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        return tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise FormatError(f"{path or default}: {exc}") from exc
    except OSError as exc:
        raise FormatError(f"{path}: {exc}") from exc
