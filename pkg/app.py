import logging
import sys
import threading

from cli.main import run
from core.config_service import ConfigService
from core.logger_setup import setup_logging
from core.task_service import get_task_service


def main(argv=None) -> int:
    """Main application entry point."""
    # --- Service Initialization ---
    config_service = ConfigService()

    # --- Logging Setup ---
    log_level = config_service.get("logging_level", "INFO")
    if not isinstance(log_level, str):
        log_level = "INFO"
    setup_logging(
        log_level,
        config_service.get_int("log_max_size_mb", 1),
        config_service.get_int("log_backup_count", 0),
    )
    logging.debug(f"[{threading.current_thread().name}] Settings loaded from {config_service.config_path}")

    try:
        return run(argv, config_service)
    finally:
        get_task_service().shutdown()
        logging.debug(f"[{threading.current_thread().name}] Worker threads released.")


if __name__ == "__main__":
    sys.exit(main())
