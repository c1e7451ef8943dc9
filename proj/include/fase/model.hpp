#pragma once

#include <cstdint>
#include <vector>

#include "fase/dictionary.hpp"
#include "fase/grid.hpp"

namespace fase {

struct ModelTerm {
    std::size_t atom = 0;
    Complex coefficient;
    friend bool operator==(const ModelTerm&, const ModelTerm&) = default;
};

/// Ordered superposition g = sum of coefficient * atom. The same atom may
/// occur in several terms. Bound to its dictionary by content hash.
struct SparseModel {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::uint64_t dictionary_hash = 0;
    std::vector<ModelTerm> terms;

    /// Evaluates g over the full grid. Throws ShapeError if `dict` is not the
    /// dictionary the model was generated with.
    Field2D materialize(const Dictionary& dict) const;
};

/// One model-generation iteration.
struct IterationRecord {
    std::size_t nu = 0;          // 1-based iteration number
    std::size_t atom = 0;        // selected index u
    Complex projection;          // p_u
    Complex coefficient;         // c = gamma * p_u
    friend bool operator==(const IterationRecord&, const IterationRecord&) = default;
};

using IterationTrace = std::vector<IterationRecord>;

/// Common result of both model generators. `model_field` is g as accumulated
/// during the iterations.
struct Extrapolation {
    SparseModel model;
    IterationTrace trace;
    Field2D model_field{1, 1};
};

}  // namespace fase
