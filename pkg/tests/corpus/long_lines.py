def very_long_function_name_for_testing(argument_number_one, argument_number_two, argument_number_three, argument_number_four):
    return argument_number_one + argument_number_two + argument_number_three + argument_number_four + argument_number_one * 2
x = "a string literal that is long enough to need wrapping on an eighty column page, definitely longer"  # and a trailing comment that is also rather long
