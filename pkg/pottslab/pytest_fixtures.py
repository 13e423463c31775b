try:
    from pottslab._pytest_fixtures import lab_context, rng_stream, tmp_artifact_dir
except ModuleNotFoundError as exc:  # pragma: no cover - only without pytest installed
    if exc.name == "pytest":
        raise ModuleNotFoundError(
            "pottslab.pytest_fixtures requires pytest. "
            'Install it with: pip install "pottslab[testing]"'
        ) from exc
    raise

__all__ = [
    "lab_context",
    "rng_stream",
    "tmp_artifact_dir",
]
