import nox
import shutil
from pathlib import Path

# --- Configuration ---
APP_NAME = "ecquiver"
DIST_DIR = Path("dist")
BUILD_DIR = Path("build")
CACHE_DIRS = [".pytest_cache", ".ruff_cache"]


# --- Nox Sessions ---
@nox.session(python=False)
def clean(session):
    """Remove build artifacts and tool caches."""
    session.log("--- Cleaning Build Artifacts ---")

    for path in [DIST_DIR, BUILD_DIR, *map(Path, CACHE_DIRS)]:
        if path.exists():
            session.log(f"Removing directory: {path}")
            shutil.rmtree(path, ignore_errors=True)

    session.log("Removing __pycache__ directories...")
    for pycache in Path(".").rglob("__pycache__"):
        if pycache.is_dir():
            shutil.rmtree(pycache, ignore_errors=True)

    session.log("✔ Clean-up complete.")


@nox.session(python=False)
def run(session):
    """Run the invariant suite from source."""
    session.log(f"--- Running {APP_NAME} selftest ---")
    session.run("poetry", "run", "python", "app.py", "selftest", *session.posargs, external=True)
    session.log("✔ Selftest passed.")


@nox.session(python=False)
def tests(session):
    """Run the test suite; pass '-m not slow' to skip the oracle and search tests."""
    session.log("--- Running Tests ---")
    session.run("poetry", "install", external=True)
    session.run("poetry", "run", "pytest", *session.posargs, external=True)
    session.log("✔ Tests passed.")


@nox.session(python=False)
def lint(session):
    """Check style with ruff."""
    session.log("--- Linting ---")
    session.run("poetry", "run", "ruff", "check", ".", external=True)
    session.log("✔ Lint clean.")
