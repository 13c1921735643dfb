"""Rewrite tests/golden/ from the current CLI output.  Run by hand after an intended change."""

from pathlib import Path

from bindmod.cli import run

HERE = Path(__file__).resolve().parent
FIX = HERE.parent / "fixtures"

CASES = {
    "validate_counterexample1": ["validate", "counterexample1"],
    "analyze_big_example_1": ["analyze", "big_example_1"],
    "analyze_big_example_2": ["analyze", "big_example_2"],
    "analyze_counterexample1": ["analyze", "counterexample1"],
    "analyze_counterexample2": ["analyze", "counterexample2"],
    "slopes_big_example_1_x5": ["slopes", "big_example_1", "--subspace", "5", "--beta", "1,1"],
    "rank_gevrey_example": ["rank", "gevrey_example"],
    "irregularity_gevrey_example": ["irregularity", "gevrey_example", "--hyperplane", "2", "--s", "3/2"],
    "gevrey_gevrey_example": ["gevrey", "gevrey_example", "--direction", "2", "--order", "4"],
    "gevrey_cusp_prime": ["gevrey", "cusp_prime", "--direction", "2", "--order", "4"],
}


def argv(case):
    cmd, name, *rest = CASES[case]
    return [cmd, str(FIX / f"{name}.json"), *rest]


def main():
    out = HERE / "golden"
    out.mkdir(exist_ok=True)
    for case in CASES:
        code, text = run(argv(case))
        assert code == 0, (case, text)
        (out / f"{case}.json").write_text(text)


if __name__ == "__main__":
    main()
