"""Plate with a circular hole under uniaxial tension, on the shipped
unstructured triangle meshes. The hoop stress at the top of the hole should
approach three times the applied stress."""

from fcfv.runs import RunConfig, run_convergence

for model in ("plane_stress", "plane_strain"):
    out = run_convergence(RunConfig(case="kirsch", model=model, levels=[1, 2, 3]))
    print(f"\n{model}")
    for row in out.rows:
        print(f"  {row['mesh_id']}: h={row['h']:.3f}  E_u={row['E_u']:.4f}  E_sigma={row['E_sigma']:.4f}  "
              f"hoop={row['scalar_value']:.2f}")
    print("  rates:", {k: round(v, 2) for k, v in out.rates.items()})
