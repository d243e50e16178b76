version = '0.3.0'
array_module = 'numpy'
array_module_version = '2.2.6'
python_version = '3.10.12'
