from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def catalog():
    from pairminer.codeterm import default_catalog

    return default_catalog()


@pytest.fixture(scope="session")
def minicorpus():
    from pairminer.ingest import load_dump

    d = FIXTURES / "minicorpus"
    return load_dump(d / "posts.jsonl", d / "versions.jsonl", d / "comments.jsonl")


@pytest.fixture(scope="session")
def fig1_corpus():
    from pairminer.ingest import load_dump

    d = FIXTURES / "fig1"
    return load_dump(d / "posts.jsonl", d / "versions.jsonl", d / "comments.jsonl")


def run_cli(*args: str) -> tuple[int, str]:
    """Run the CLI in-process, returning (exit_code, stdout)."""
    import io
    from contextlib import redirect_stdout

    from pairminer.cli import main

    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(list(args))
    return code, buf.getvalue()
