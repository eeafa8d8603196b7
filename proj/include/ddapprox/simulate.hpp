#pragma once

#include <vector>

#include "ddapprox/circuit.hpp"
#include "ddapprox/dd.hpp"

namespace ddapprox {

/// Weights with magnitude below this are snapped to exact zero.
inline constexpr double kSnapTolerance = 1e-14;

/// Largest register dense_simulate accepts.
inline constexpr int kMaxDenseQubits = 24;

/// Applies `gate` to `dd` in place. Throws UnsupportedOnApproximatedDD if
/// the diagram carries replacements.
void apply_gate(DecisionDiagram &dd, const Gate &gate);

/// Final-state DD of `circuit` starting from |0...0>.
DecisionDiagram simulate_circuit(const Circuit &circuit);

/// Reference dense simulation, qubit q on index bit n-1-q.
std::vector<Complex> dense_simulate(const Circuit &circuit);

} // namespace ddapprox
