qc = QuantumCircuit(3, 1)
qc.h(0)
qc.cx(0, 1)
qc.measure(0, 0)
qc.measure(1, 0)
