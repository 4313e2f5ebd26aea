#pragma once

#include "dagmf/solver/field.hpp"

namespace dagmf {

/// Forward differences; the component along an axis is zero on the last
/// slice of that axis (zero-flux boundary).
VectorField gradient(const ScalarField& u);

/// Negative adjoint of gradient(): sum(grad u . q) == -sum(u * div q).
ScalarField divergence(const VectorField& q);

/// Scales q radially at every voxel where |q| exceeds cap.
VectorField project_flow(const VectorField& q, const ScalarField& cap);

/// Per-voxel Euclidean norm.
ScalarField magnitude(const VectorField& q);

}  // namespace dagmf
