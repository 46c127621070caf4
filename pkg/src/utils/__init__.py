# Utils package for the geometric phase toolkit