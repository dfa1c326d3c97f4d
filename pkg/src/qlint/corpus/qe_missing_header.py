qasm = "qreg q[2];\ncreg c[2];\nh q[0];"
qc = QuantumCircuit.from_qasm_str(qasm)
