"""Run the acceptance criteria without pytest; exit status 1 if any fails."""
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from test_acceptance import CRITERIA, evaluate  # noqa: E402


def main() -> int:
    failed = 0
    for crit in CRITERIA:
        ok, line, _ = evaluate(*crit)
        print(line, flush=True)
        failed += not ok
    print(f"{len(CRITERIA) - failed}/{len(CRITERIA)} criteria pass")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
