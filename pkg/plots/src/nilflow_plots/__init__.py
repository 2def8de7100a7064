from .figures import ScanFrame, TableFrame, plot_convergence, plot_fig1

__version__ = "0.1.0"
