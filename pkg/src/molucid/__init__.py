"""molucid: molecular structure elucidation from NMR/formula inputs.

An LLM critique-and-rewrite tree search guided by a natively trained
molecule-spectrum scorer and a molecular substructure knowledge base.
"""

__version__ = "0.1.0"
