qc = QuantumCircuit(2)
qc.h(0)
backend = Aer.get_backend("qasm_simulator")
tqc = transpile(qc, backend, coupling_map=7)
