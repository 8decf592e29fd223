import sys
from pathlib import Path

import pytest

REPO_ROOT = Path(__file__).resolve().parent.parent
DATA_DIR = REPO_ROOT / "data"
FIXTURE_CORPUS = DATA_DIR / "sports" / "cup-final.jsonl"
GOLDEN_DIR = Path(__file__).resolve().parent / "golden"
TEST_DATA_DIR = Path(__file__).resolve().parent / "data"

# let the suite run from a clean checkout without an install step
if str(REPO_ROOT / "src") not in sys.path:
    sys.path.insert(0, str(REPO_ROOT / "src"))

from pagebreak.corpus import ArticleRecord
from pagebreak.textproc import FilterConfig, prepare_article


def make_record(body: str, article_id: str = "a1", corpus_id: str = "c1",
                subject: str = "sports", title: str = "t") -> ArticleRecord:
    return ArticleRecord(id=article_id, corpus_id=corpus_id, subject=subject,
                        title=title, body=body)


def prepared(body: str, article_id: str = "a1", cfg: FilterConfig | None = None):
    return prepare_article(make_record(body, article_id=article_id), cfg)


@pytest.fixture
def fixture_corpus_path() -> Path:
    return FIXTURE_CORPUS
