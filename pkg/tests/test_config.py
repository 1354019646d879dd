import json
import logging

import pydantic
import pytest

from core.config import AlgebraSpec, FanSpec, MatrixSpec, RunConfig
from core.config_service import ConfigService
from core.constants import LOG_FILE_NAME
from core.error_handling import (
    CommandErrorHandler,
    ComputationError,
    ProjectiveHomomorphismError,
    ValidationError,
    validation_error_from_pydantic,
)
from core.logger_setup import setup_logging
from core.types import ExitCode, StatusType


def test_defaults_are_written_on_first_use(app_home):
    service = ConfigService()
    assert service.config_path == app_home / "settings.json"
    assert json.loads(service.config_path.read_text(encoding="utf-8"))["sampled_denominator"] == 60
    assert service.get("default_field") == "q"
    assert service.get_int("worker_count", 0) == 0


def test_settings_file_overrides_defaults(app_home):
    app_home.mkdir(parents=True)
    (app_home / "settings.json").write_text(
        json.dumps({"default_field": "fp:5", "sampled_denominator": 8, "worker_count": -3}), encoding="utf-8"
    )
    service = ConfigService()
    assert service.get("default_field") == "fp:5"
    assert service.get_int("sampled_denominator", 2) == 8
    # below the minimum: back to the default
    assert service.get_int("worker_count", 0) == 0
    assert service.get("logging_level") == "INFO"


def test_unusable_integers_fall_back(app_home):
    app_home.mkdir(parents=True)
    (app_home / "settings.json").write_text(json.dumps({"default_seed": "7", "log_backup_count": True}))
    service = ConfigService()
    assert service.get_int("default_seed", 0) == 0
    assert service.get_int("log_backup_count", 0) == 5


@pytest.mark.parametrize("content", ["{not json", "[1, 2]"])
def test_broken_settings_file_uses_defaults(app_home, caplog, content):
    app_home.mkdir(parents=True)
    (app_home / "settings.json").write_text(content, encoding="utf-8")
    with caplog.at_level(logging.WARNING):
        service = ConfigService()
    assert service.config == ConfigService().config
    assert "using defaults" in caplog.text


def test_save_config_round_trips(app_home):
    service = ConfigService()
    service.config["default_seed"] = 42
    service.save_config()
    assert ConfigService().get_int("default_seed", 0) == 42


def test_setup_logging_writes_under_app_home(app_home, root_logger):
    path = setup_logging("debug", 1, 0)
    assert path == app_home / "logs" / LOG_FILE_NAME
    logging.debug("log line")
    for handler in root_logger.handlers:
        handler.flush()
    assert "log line" in path.read_text(encoding="utf-8")
    assert root_logger.level == logging.DEBUG


def test_run_config_fields():
    assert RunConfig(field="fp:7").prime == 7
    assert RunConfig(field=" Q ").prime == 0
    for bad in ("fp:9", "gf:3", "rationals"):
        with pytest.raises(pydantic.ValidationError):
            RunConfig(field=bad)
    with pytest.raises(pydantic.ValidationError):
        RunConfig(seed=-1)
    with pytest.raises(pydantic.ValidationError):
        RunConfig(sampled_denominator=1)


@pytest.mark.parametrize(
    "data, message",
    [
        ({"lattice_rank": 2, "rays": [[1, 0, 0]], "max_cones": [[0]]}, "ray 0 has 3 coordinates"),
        ({"lattice_rank": 1, "rays": [[1]], "max_cones": [[]]}, "cone 0 is empty"),
        ({"lattice_rank": 1, "rays": [[1]], "max_cones": [[0, 0]]}, "repeats a ray"),
        ({"lattice_rank": 1, "rays": [[1]], "max_cones": [[0]], "name": "x"}, "Extra inputs"),
    ],
)
def test_fan_file_model(data, message):
    with pytest.raises(pydantic.ValidationError, match=message):
        FanSpec.model_validate(data)


def test_algebra_file_model():
    with pytest.raises(pydantic.ValidationError, match="unit has 1 entries"):
        AlgebraSpec(dim=2, unit=[1], structure_constants=[[[1, 0], [0, 1]], [[0, 1], [0, 0]]])
    with pytest.raises(pydantic.ValidationError, match="not a 2x2 block"):
        AlgebraSpec(dim=2, unit=[1, 0], structure_constants=[[[1, 0], [0, 1]], [[0, 1]]])
    with pytest.raises(pydantic.ValidationError, match="not prime"):
        AlgebraSpec(dim=1, unit=[1], structure_constants=[[[1]]], field="fp:4")


def test_matrix_file_model():
    assert MatrixSpec(rows=[[1, "1/2"], [0, 1]]).rows[0][1] == "1/2"
    with pytest.raises(pydantic.ValidationError, match="equal length"):
        MatrixSpec(rows=[[1, 0], [1]])


def test_pydantic_errors_become_one_line_validation_errors():
    with pytest.raises(pydantic.ValidationError) as info:
        FanSpec.model_validate({"lattice_rank": 0, "rays": [[1]], "max_cones": [[0]]})
    error = validation_error_from_pydantic(info.value, "fan.json")
    assert isinstance(error, ValidationError)
    assert str(error).startswith("fan.json: field 'lattice_rank':")


@pytest.mark.parametrize(
    "exception, code, status",
    [
        (ValidationError("bad\nweights"), ExitCode.VALIDATION, StatusType.VALIDATION_FAILED),
        (ComputationError("bound exceeded"), ExitCode.COMPUTATION, StatusType.ERROR),
        (ProjectiveHomomorphismError("not multiplicative", (0, 1)), ExitCode.COMPUTATION, StatusType.ERROR),
        (KeyError("x"), ExitCode.COMPUTATION, StatusType.ERROR),
    ],
)
def test_error_handler_maps_exit_codes(caplog, exception, code, status):
    with caplog.at_level(logging.ERROR):
        result = CommandErrorHandler().handle_command_exception(exception, "theta")
    assert result.exit_code == code
    assert result.status == status
    assert "\n" not in result.message
    assert caplog.records[-1].getMessage().startswith("  -> ERROR in theta: ")
