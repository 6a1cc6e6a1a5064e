"""Bundled example surveys."""

from importlib.resources import files


def fixture_text(name: str) -> str:
    """UTF-8 content of a bundled fixture file."""
    return (files(__package__) / name).read_text(encoding="utf-8")


def sedentary_survey_text() -> str:
    return fixture_text("sedentary.survey.json")
