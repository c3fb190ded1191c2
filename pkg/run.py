from fairness_engine.utils import create_workflow

workflow = create_workflow(
    config="configs/for_synthetic/run.yaml")
workflow.execute()
