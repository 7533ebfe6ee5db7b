"""Machine checks for a finite presentation of the second homology of the Torelli subgroup IA_n."""

__version__ = "0.1.0"
