qc = QuantumCircuit(3)
qc.append(bell_gate, [0, 1])
