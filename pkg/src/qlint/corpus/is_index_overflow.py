qc = QuantumCircuit(3)
qc.h(3)
