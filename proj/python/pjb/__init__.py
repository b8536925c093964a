"""Model spaces of finite Blaschke products, Jordan blocks and their submodules."""

import json

from ._pjb import (
    BlaschkeProduct,
    JordanBlockProduct,
    MixedSpace,
    ModelSpace,
    PjbError,
    Subspace,
    backward_shift_theta,
    build_submodule,
    classify_submodule,
    compressed_shift,
    decompose_doubly_commuting,
    decompose_mixed,
    defect_identities,
    equal_up_to_unimodular,
    factorizations,
    fingerprint,
    intertwiner_oracle,
    is_doubly_commuting,
    is_submodule,
    mixed_submodule,
    orthogonality_impossibility,
    parseval_frame_residual,
    project_one,
    reducing_split,
    run_scenario,
    star_closure_full,
    star_cyclicity_check,
    tensor_submodule,
)


def error_code(exc):
    """Name of the failure category carried by a PjbError, e.g. "NotAFactor"."""
    return str(exc).split(":", 1)[0]


def run(scenario, seed=None, tolerances=None, jobs=1):
    """Run a scenario given as a dict or JSON text; returns (report dict, exit code)."""
    text = scenario if isinstance(scenario, str) else json.dumps(scenario)
    report, code = run_scenario(text, seed, tolerances or {}, jobs)
    return json.loads(report), code
