"""Per-criterion outcomes collected during the acceptance run."""

RESULTS = {}


def record(number, ok, detail=""):
    RESULTS[number] = (bool(ok), detail)
    print(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
    return ok
