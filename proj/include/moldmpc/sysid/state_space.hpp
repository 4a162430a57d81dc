#pragma once

#include "moldmpc/sysid/arx.hpp"

namespace moldmpc
{

/// State-space realization of an ArxModel. The state stacks
/// [y_t; y_{t-1}; ...; y_{t-r+1}; u_{t-1}; ...; u_{t-s}] in deviation units,
/// so n = m r + nu s, and X_{t+1} = A X_t + B U_t, Y_t = C X_t.
struct StateSpaceModel
{
    Matrix A;
    Matrix B;
    Matrix C;
    int m = 0;
    int nu = 0;
    int r = 1;
    int s = 0;
    ArxBaseline baseline;
    double sample_period = 200.0;

    int state_size() const { return static_cast<int>(A.rows()); }
    /// Offset of the y_{t-lag} block in the state.
    int output_block(int lag) const { return lag * m; }
    /// Offset of the u_{t-lag} block (lag >= 1).
    int input_block(int lag) const { return m * r + (lag - 1) * nu; }

    /// State from absolute-unit history: recent_y rows y_t, y_{t-1}, ...;
    /// past_u rows u_{t-1}, u_{t-2}, ...
    Vector state_from_history(const Matrix& recent_y, const Matrix& past_u) const;
};

StateSpaceModel arx_to_statespace(const ArxModel& model);

/// State-space model with random-walk perturbation states appended:
///   A_m = [[A, B_p], [0, I]],  B_m = [[B], [0]],  C_m = [C, 0].
struct AugmentedModel
{
    Matrix A;
    Matrix B;
    Matrix C;
    Matrix Bp; // n x p
    int base_states = 0;
    int p = 0;
    StateSpaceModel base;

    int state_size() const { return static_cast<int>(A.rows()); }
    int outputs() const { return static_cast<int>(C.rows()); }
    int inputs() const { return static_cast<int>(B.cols()); }
};

/// Perturbation j drives output slot j of the y_t block (p <= m).
AugmentedModel augment_with_perturbations(const StateSpaceModel& ss, int p);

/// General form: column j of `output_map` (m x p) says how perturbation j
/// enters the y_t block, so B_p = [output_map; 0].
AugmentedModel augment_with_perturbations(const StateSpaceModel& ss, const Matrix& output_map);

} // namespace moldmpc
