sub = QuantumCircuit(2)
sub.h(0)
qc = QuantumCircuit(2)
qc.append(sub, [0, 1])
