qc = QuantumCircuit(1)
qc.u1(0.5, 0)
