theta = "1.57"
qc = QuantumCircuit(1)
qc.rx(theta, 0)
