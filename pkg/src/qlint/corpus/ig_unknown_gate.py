qc = QuantumCircuit(2)
qc.h(0)
qc.rand_gate(0)
