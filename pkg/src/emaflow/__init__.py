"""emaflow: schema-driven engine for voice-first EMA questionnaires."""

__version__ = "0.1.0"
