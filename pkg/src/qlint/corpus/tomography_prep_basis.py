circ = QuantumCircuit(1, 1)
circ.x(0)

tomo = ProcessTomography(
    circuit=circ,
    measurement_basis=PauliMeasurementBasis(),
    measurement_qubits=None,
    preparation_basis=PauliMeasurementBasis(),
    preparation_qubits=None,
    basis_indices=None,
    qubits=None)
