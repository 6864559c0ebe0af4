import os

TEMPLATES_DIR = os.path.join(os.path.dirname(os.path.dirname(__file__)), "templates")


def load_template(filename: str) -> str:
    """Loads a report template from the templates directory."""
    path = os.path.join(TEMPLATES_DIR, filename)
    with open(path, "r", encoding="utf-8") as f:
        return f.read().strip()


def render_template(filename: str, **fields) -> str:
    return load_template(filename).format(**fields)
