qreg = QuantumRegister(2)
creg = ClassicalRegister(2)
qc = QuantumCircuit(qreg)
qc.h(0)
qc.cx(0, 1)
