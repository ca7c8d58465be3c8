import pandas as pd

COLUMNS = ["instance", "n_topes", "theorem_match", "conjecture_match", "skipped", "failed"]


def sweep_frame(rows: list[dict]) -> pd.DataFrame:
    """One row per sweep instance; skipped and failed instances carry no verdicts."""
    frame = pd.DataFrame(rows, columns=COLUMNS)
    frame["skipped"] = frame["skipped"].eq(True)
    frame["failed"] = frame["failed"].eq(True)
    return frame


def _completed(frame: pd.DataFrame) -> pd.DataFrame:
    return frame[~(frame["skipped"] | frame["failed"])].astype(
        {"n_topes": int, "theorem_match": bool, "conjecture_match": bool}
    )


def summarize_sweep(frame: pd.DataFrame) -> dict[str, int]:
    done = _completed(frame)
    return {
        "instances": len(frame),
        "skipped": int(frame["skipped"].sum()),
        "failed": int(frame["failed"].sum()),
        "theorem_matches": int(done["theorem_match"].sum()),
        "conjecture_matches": int(done["conjecture_match"].sum()),
        "conjecture_mismatches": int((~done["conjecture_match"]).sum()),
    }


def render_summary(frame: pd.DataFrame) -> str:
    lines = [" ".join(f"{key}={value}" for key, value in summarize_sweep(frame).items())]
    done = _completed(frame)
    if not done.empty:
        by_size = done.groupby("n_topes")["conjecture_match"].agg(["count", "sum"])
        for n_topes, row in by_size.iterrows():
            lines.append(f"  {n_topes} bounded topes: {row['sum']}/{row['count']} match")
    return "\n".join(lines)
