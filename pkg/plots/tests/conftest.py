import pytest

HEADER = "family,n,p_or_c,method,trial,code_length,wall_time_s,iterations,residual,seed"


def row(
    family="UNDIRECTED_ER",
    n=10,
    p=0.5,
    method="AP_EIG",
    trial=0,
    code_length=3,
    wall=0.0,
    iters=100,
    residual=0.0005,
    seed=0,
):
    return (family, n, p, method, trial, code_length, wall, iters, residual, seed)


def make_csv(path, rows):
    lines = [HEADER] + [",".join(str(v) for v in r) for r in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def csv_two_methods(tmp_path):
    """2 methods x 2 n x 2 p, 2 trials each; code lengths mean cleanly."""
    rows = []
    for method, bump in (("GREEDY_COLORING", 2), ("AP_EIG", 0)):
        for n in (10, 20):
            for p in (0.2, 0.5):
                for trial in range(2):
                    rows.append(
                        row(
                            n=n,
                            p=p,
                            method=method,
                            trial=trial,
                            code_length=n // 5 + bump + trial,
                            wall=0.25 * (trial + 1),
                            iters=50 * (trial + 1),
                        )
                    )
    return make_csv(tmp_path / "bench.csv", rows)
