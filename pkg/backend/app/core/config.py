import logging

logger = logging.getLogger(__name__)

class Settings:
    # Caps that keep every computation at desk scale
    ORDER_CAP: int = 20000
    SEARCH_CAP: int = 2_000_000

    # Verification suites
    VERIFY_MAX_ORDER: int = 24
    RANDOM_SEED: int = 20240601
    RANDOM_SAMPLES: int = 100
    LATTICE_SAMPLES: int = 500

    LOG_LEVEL: str = "WARNING"

    def __init__(self, **overrides):
        self.update(**overrides)

    def update(self, **overrides):
        # Overrides come from CLI flags only; no environment is consulted
        for name, value in overrides.items():
            if value is None:
                continue
            if not hasattr(type(self), name):
                raise AttributeError(f"Unknown setting: {name}")
            setattr(self, name, value)

    def reset(self):
        for name in list(vars(self)):
            if name.isupper():
                delattr(self, name)

    def validate(self):
        positive_settings = [
            "ORDER_CAP",
            "SEARCH_CAP",
            "VERIFY_MAX_ORDER",
            "RANDOM_SAMPLES",
            "LATTICE_SAMPLES",
        ]

        invalid = []
        for setting in positive_settings:
            value = getattr(self, setting, None)
            if not isinstance(value, int) or value < 1:
                invalid.append(setting)

        if invalid:
            logger.error(f"Invalid config values: {invalid}")
            raise RuntimeError(f"Invalid config values: {invalid}")

        if self.LOG_LEVEL.upper() not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"LOG_LEVEL is not a logging level: {self.LOG_LEVEL}")

        return True


settings = Settings()
try:
    settings.validate()
except Exception as e:
    logger.error(f"Settings validation failed: {e}")
