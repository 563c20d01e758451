import pytest

from rho_lab.harness import ExperimentConfig, run_experiment

# Acceptance grid: enough trials per group order that the degeneracy
# bound of criterion 7 tolerates at least one Poisson event, and the
# total clears 10^4 trials for criterion 5.
ACCEPTANCE_SEED = 20250810
ACCEPTANCE_TRIALS = {1009: 9000, 10007: 2500, 100003: 8000}


def _run_grid(policy: str):
    reports = {}
    for n, trials in ACCEPTANCE_TRIALS.items():
        config = ExperimentConfig(
            n_list=(n,),
            trials=trials,
            exponent_step_policy=policy,
            master_seed=ACCEPTANCE_SEED,
        )
        reports[n] = run_experiment(config)
    return reports


@pytest.fixture(scope="session")
def fixed2_grid_reports():
    """Collision-trial reports with the squaring step, per group order."""
    return _run_grid("fixed2")


@pytest.fixture(scope="session")
def auto_grid_reports():
    """Same grid with the power step auto-selected by order threshold."""
    return _run_grid("auto")
