import json
import logging
from pathlib import Path


class ConfigService:
    """Manages loading and saving of the application's configuration."""

    def __init__(self):
        self._config_filename = "settings.json"
        self._default_config = {
            "logging_level": "INFO",
            "log_max_size_mb": 3,
            "log_backup_count": 5,
            "default_field": "q",
            "default_seed": 0,
            "sampled_denominator": 60,
            "worker_count": 0,
        }
        self._config_dir = self._get_config_dir()
        self._config_path = self._config_dir / self._config_filename

        # All keys are initialized from defaults, then overwritten by file.
        self.config = self._load_config()

    @property
    def config_path(self) -> Path:
        return self._config_path

    def _get_config_dir(self) -> Path:
        """Gets the application data directory, ensuring it exists."""
        from .utils import get_app_data_dir

        app_dir = get_app_data_dir()
        app_dir.mkdir(parents=True, exist_ok=True)
        return app_dir

    def _load_config(self) -> dict:
        """Loads settings.json, creating a default one if it doesn't exist."""
        config = self._default_config.copy()

        if not self._config_path.exists():
            try:
                with open(self._config_path, "w", encoding="utf-8") as f:
                    json.dump(self._default_config, f, indent=4)
            except OSError as e:
                logging.warning(f"Could not create default config file: {e}")
            return config

        try:
            with open(self._config_path, "r", encoding="utf-8") as f:
                loaded_config = json.load(f)
            if not isinstance(loaded_config, dict):
                raise ValueError("top level is not an object")
            config.update(loaded_config)
        except (json.JSONDecodeError, OSError, ValueError) as e:
            logging.warning(f"Could not load {self._config_filename}, using defaults: {e}")
        return config

    def get(self, key, default=None):
        """Gets a configuration value by key."""
        return self.config.get(key, default)

    def get_int(self, key: str, minimum: int) -> int:
        """Gets an integer setting, falling back to the default when the stored value is unusable."""
        value = self.config.get(key)
        if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
            return self._default_config[key]
        return value

    def save_config(self):
        """Saves the current configuration dictionary to settings.json."""
        try:
            with open(self._config_path, "w", encoding="utf-8") as f:
                json.dump(self.config, f, indent=4)
        except OSError as e:
            logging.error(f"Could not save config file: {e}")
