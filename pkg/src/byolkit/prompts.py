"""Prompt templates shipped as data files, with placeholder substitution.

These are payloads for external LLM services (text refinement, alignment,
cleanup, post-editing, benchmark generation, pairwise judging); the toolkit
never executes them itself. Placeholders are ALL_CAPS names in braces, e.g.
{LANGUAGE_NAME}; literal braces in a template (JSON examples) are left
untouched.
"""

import re
from importlib import resources

from .errors import ContractViolation

_PLACEHOLDER = re.compile(r"\{([A-Z][A-Z0-9_]*)\}")


def list_templates():
    root = resources.files("byolkit").joinpath("data/prompts")
    return sorted(item.name[: -len(".txt")] for item in root.iterdir() if item.name.endswith(".txt"))


def load_template(name):
    path = resources.files("byolkit").joinpath(f"data/prompts/{name}.txt")
    try:
        return path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ContractViolation(
            f"unknown prompt template {name!r}; available: {list_templates()}"
        ) from None


def placeholders(template_text):
    return sorted(set(_PLACEHOLDER.findall(template_text)))


def fill_template(template_text, **values):
    """Substitute {ALL_CAPS} placeholders; unfilled ones are an error."""
    missing = [name for name in placeholders(template_text) if name not in values]
    if missing:
        raise ContractViolation(f"unfilled placeholders: {missing}")
    return _PLACEHOLDER.sub(lambda match: str(values[match.group(1)]), template_text)
