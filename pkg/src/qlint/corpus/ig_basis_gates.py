qc = QuantumCircuit(2)
qc.h(0)
qc.cx(0, 1)
qc.rz(0.5, 1)
backend = Aer.get_backend("qasm_simulator")
tqc = transpile(qc, backend, basis_gates=["cx", "rz"])
