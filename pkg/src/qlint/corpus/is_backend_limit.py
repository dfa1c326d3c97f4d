simulator = Aer.get_backend("qasm_simulator")
qreg = QuantumRegister(30)
creg = ClassicalRegister(30)
qc = QuantumCircuit(qreg, creg)
qc.h(0)
qc.measure(qreg, creg)
