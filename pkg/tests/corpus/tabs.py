def tabbed():
	if True:
		return 1	# tab before comment
