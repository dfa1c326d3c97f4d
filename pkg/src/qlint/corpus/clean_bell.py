from qiskit import QuantumCircuit, Aer

qc = QuantumCircuit(2, 2)
qc.h(0)
qc.cx(0, 1)
qc.measure([0, 1], [0, 1])
backend = Aer.get_backend("qasm_simulator")
job = backend.run(qc, shots=512)
result = job.result()
counts = result.get_counts()
print(counts)
