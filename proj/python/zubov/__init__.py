"""Worst-case region-of-attraction toolkit (pybind11 bindings)."""

from ._core import (  # noqa: F401
    ArgumentError,
    ConfigParseError,
    DisturbanceBox,
    Domain,
    MlpParams,
    NumericError,
    PerturbedSystem,
    RolloutParams,
    TrainConfig,
    ValueGrid,
    boundary_loss,
    build_anchor_set,
    data_loss,
    default_train_config,
    evaluate_on_grid,
    export_grid,
    extract_contour,
    forward,
    forward_batch,
    forward_with_input_grad,
    hamiltonian,
    init_params,
    kruzkov_transform,
    load_checkpoint,
    load_grid,
    make_inverted_pendulum,
    make_linear_2d,
    make_product_system,
    make_system,
    make_van_der_pol,
    mean_abs_diff,
    optimal_disturbance,
    residual_loss,
    rollout_value,
    run_gradcheck,
    sample_boundary,
    sample_interior,
    set_thread_count,
    solve_fdm,
    sup_diff,
    train,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
